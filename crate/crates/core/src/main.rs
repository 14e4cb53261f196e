fn main() {
    std::process::exit(brauer_udr::cli::run(std::env::args_os()));
}
