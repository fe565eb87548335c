fn main() {
    std::process::exit(trifree::cli::run(std::env::args_os()));
}
