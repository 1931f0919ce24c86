fn main() {
    std::process::exit(e2rc_cli::run(std::env::args_os()));
}
