fn main() {
    nbc_core::cli::main()
}
