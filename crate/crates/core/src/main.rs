fn main() {
    std::process::exit(adahaar::cli::run(std::env::args_os()));
}
