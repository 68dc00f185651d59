fn main() {
    std::process::exit(nv_thompson::cli::main());
}
