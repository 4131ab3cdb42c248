#include <cstdio>
int main() { std::puts("riffle placeholder"); return 0; }
