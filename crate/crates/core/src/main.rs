fn main() {
    std::process::exit(helix_srf::cli::run_cli(std::env::args_os()));
}
