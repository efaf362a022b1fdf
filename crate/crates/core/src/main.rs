fn main() {
    std::process::exit(qpga::cli::main());
}
