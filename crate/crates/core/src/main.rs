fn main() {
    std::process::exit(entgate::cli::main_with_env());
}
