fn main() {
    std::process::exit(simplemech::cli::run());
}
