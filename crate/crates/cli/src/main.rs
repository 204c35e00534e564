fn main() {
    std::process::exit(adhmlab_cli::main_with(std::env::args().collect()));
}
