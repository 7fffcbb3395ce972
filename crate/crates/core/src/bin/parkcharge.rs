fn main() {
    std::process::exit(parkcharge::cli::main_with_args(std::env::args_os()));
}
