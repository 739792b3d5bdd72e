fn main() {
    std::process::exit(tokaut::cli::main());
}
