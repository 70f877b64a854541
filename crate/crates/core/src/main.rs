fn main() {
    std::process::exit(majorana_transmon::cli::run(std::env::args_os()));
}
