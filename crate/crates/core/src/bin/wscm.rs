fn main() {
    std::process::exit(wscm::cli::run());
}
