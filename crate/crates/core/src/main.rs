fn main() {
    std::process::exit(iplus::cli::run(std::env::args_os()));
}
