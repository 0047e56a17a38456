fn main() {
    std::process::exit(subcity::cli::run(std::env::args_os()));
}
