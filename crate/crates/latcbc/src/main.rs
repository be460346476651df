fn main() {
    std::process::exit(latcbc::cli::run_main());
}
