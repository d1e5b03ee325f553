fn main() {
    std::process::exit(noxcast::cli::run(std::env::args_os()));
}
