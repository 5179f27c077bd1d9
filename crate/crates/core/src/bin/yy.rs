fn main() {
    std::process::exit(yinyang::cli::run(std::env::args_os()));
}
