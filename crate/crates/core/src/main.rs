fn main() {
    std::process::exit(jacobi::cli::run(std::env::args_os()));
}
