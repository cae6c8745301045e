fn main() {
    std::process::exit(changhee_zeta::cli::run(std::env::args()));
}
