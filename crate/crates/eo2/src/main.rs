fn main() {
    std::process::exit(eo2::cli::run());
}
