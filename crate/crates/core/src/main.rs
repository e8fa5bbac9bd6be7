fn main() {
    std::process::exit(spinal_lab::cli::run(std::env::args()));
}
