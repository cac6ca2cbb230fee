fn main() {
    std::process::exit(qcr::cli::run(std::env::args_os()));
}
