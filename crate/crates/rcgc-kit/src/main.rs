fn main() {
    std::process::exit(rcgc_kit::cli::main_with_args(std::env::args_os()));
}
