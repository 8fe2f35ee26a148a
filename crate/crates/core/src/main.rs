fn main() {
    std::process::exit(sqgt::cli::main_with_args(std::env::args_os()));
}
