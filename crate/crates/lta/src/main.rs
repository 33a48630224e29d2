fn main() {
    std::process::exit(lta::run_from_args(std::env::args_os()));
}
