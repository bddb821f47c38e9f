fn main() {
    std::process::exit(promoscan::cli::run(std::env::args_os()));
}
