fn main() {
    std::process::exit(xcs2d::cli::run(std::env::args_os()));
}
