fn main() {
    std::process::exit(gnwave::cli::commands::main_with_args(std::env::args_os()));
}
