fn main() {
    std::process::exit(wmlab::cli::run(std::env::args_os()));
}
