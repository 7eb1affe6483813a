fn main() {
    std::process::exit(nogo_core::cli::main());
}
