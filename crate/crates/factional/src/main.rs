fn main() {
    std::process::exit(factional::run(std::env::args_os()));
}
