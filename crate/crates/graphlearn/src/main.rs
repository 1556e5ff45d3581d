fn main() {
    std::process::exit(graphlearn::cli::run(std::env::args_os()));
}
