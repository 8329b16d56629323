fn main() {
    std::process::exit(probelab::cli::run(std::env::args_os()));
}
