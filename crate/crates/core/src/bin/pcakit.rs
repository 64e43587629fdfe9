fn main() {
    std::process::exit(pcakit::cli::run(std::env::args_os()));
}
