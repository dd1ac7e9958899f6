fn main() {
    std::process::exit(fracsolve::cli::main(std::env::args_os()));
}
