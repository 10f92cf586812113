fn main() {
    std::process::exit(mixtime::cli::run(std::env::args_os()));
}
