fn main() {
    std::process::exit(sphere_blowup::cli::main());
}
