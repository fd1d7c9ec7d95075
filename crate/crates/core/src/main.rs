fn main() {
    std::process::exit(infoam::cli::run(std::env::args_os()));
}
