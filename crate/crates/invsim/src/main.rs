fn main() {
    std::process::exit(invsim::cli::main(std::env::args_os()));
}
