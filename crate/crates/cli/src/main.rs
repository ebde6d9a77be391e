fn main() {
    std::process::exit(toricfan_cli::run(std::env::args_os()));
}
