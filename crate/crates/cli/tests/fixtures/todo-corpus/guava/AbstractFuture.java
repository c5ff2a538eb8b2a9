package guava;

class AbstractFuture {
    // plain note without the marker
    int size;

    // TODO(lukes): investigate using the @Contended annotation on these fields when jdk8 is available
    void step0() {
    }
}
