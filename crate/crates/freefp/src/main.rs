fn main() {
    std::process::exit(freefp::cli::run(std::env::args_os()));
}
