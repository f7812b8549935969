fn main() {
    std::process::exit(subtele::cli::run(std::env::args_os()));
}
