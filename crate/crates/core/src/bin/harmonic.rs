fn main() {
    std::process::exit(harmonic_fields::io::run_cli(std::env::args_os()));
}
