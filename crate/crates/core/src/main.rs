fn main() {
    std::process::exit(ballcover::cli::dispatch(std::env::args_os()));
}
