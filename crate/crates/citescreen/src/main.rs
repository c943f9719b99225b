fn main() {
    std::process::exit(citescreen::cli::dispatch(std::env::args_os()));
}
