// Placeholder main; the full CLI is added with the io module.
int main() { return 0; }
