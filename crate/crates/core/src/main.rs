fn main() {
    std::process::exit(sasaki_extremal::cli::run(std::env::args_os()));
}
