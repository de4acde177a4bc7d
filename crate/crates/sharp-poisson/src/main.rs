fn main() {
    std::process::exit(sharp_poisson::harness::cli::run());
}
