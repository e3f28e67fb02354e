fn main() {
    std::process::exit(regen_bounds::cli::run());
}
