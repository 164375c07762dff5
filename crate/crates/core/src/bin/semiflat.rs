fn main() {
    std::process::exit(semiflat::cli::main());
}
