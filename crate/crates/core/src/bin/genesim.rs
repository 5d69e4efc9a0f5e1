fn main() {
    std::process::exit(genesim::cli::run(std::env::args_os()));
}
