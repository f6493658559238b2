fn main() {
    std::process::exit(qrep::cli::run());
}
