fn main() {
    std::process::exit(sentsim::cli::run(std::env::args_os()));
}
