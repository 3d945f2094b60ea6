fn main() {
    std::process::exit(zerosum::cli::dispatch(std::env::args()));
}
