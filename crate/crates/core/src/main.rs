fn main() {
    std::process::exit(tridiag::cli::run(std::env::args_os()));
}
