fn main() {
    std::process::exit(ghch::cli::run());
}
