fn main() {
    std::process::exit(evotopo_cli::app::main_entry());
}
