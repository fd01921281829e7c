fn main() {
    std::process::exit(semiflag_cli::run(std::env::args().skip(1).collect()));
}
