fn main() {
    std::process::exit(homkit::cli::main_entry());
}
