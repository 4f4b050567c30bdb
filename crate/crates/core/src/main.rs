fn main() {
    std::process::exit(infocomp::cli::run(std::env::args()));
}
