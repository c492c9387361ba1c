fn main() {
    std::process::exit(dolbeault_cli::run(std::env::args_os()));
}
