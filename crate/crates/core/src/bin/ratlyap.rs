fn main() {
    std::process::exit(ratlyap::cli::run(std::env::args_os()));
}
