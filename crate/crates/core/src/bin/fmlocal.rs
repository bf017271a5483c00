fn main() {
    std::process::exit(fmlocal::cli::run(std::env::args_os()));
}
