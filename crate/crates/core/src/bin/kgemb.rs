fn main() {
    std::process::exit(kgemb::cli::main());
}
