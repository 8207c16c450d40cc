fn main() {
    std::process::exit(spectral_layers::cli::run(std::env::args_os()));
}
