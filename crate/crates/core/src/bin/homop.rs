fn main() {
    std::process::exit(homop::cli::run(std::env::args_os()));
}
