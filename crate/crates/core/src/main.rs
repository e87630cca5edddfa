fn main() {
    std::process::exit(genlab::cli::main_with_args(std::env::args_os()));
}
