fn main() {
    std::process::exit(multijet::cli::run(std::env::args_os()));
}
