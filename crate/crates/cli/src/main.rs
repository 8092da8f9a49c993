fn main() {
    std::process::exit(eif_cli::run(std::env::args_os()));
}
