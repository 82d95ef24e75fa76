fn main() {
    std::process::exit(boltzwave::cli::main_with_args(std::env::args_os()));
}
