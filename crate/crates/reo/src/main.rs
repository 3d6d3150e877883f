fn main() {
    std::process::exit(reo::cli::run(std::env::args_os()));
}
