fn main() {
    std::process::exit(conformable_greens::cli::run(std::env::args_os()));
}
