fn main() {
    std::process::exit(meancurve::cli::run());
}
