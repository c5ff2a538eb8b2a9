package guava;

class ThrowablesTest {
    // plain note without the marker
    int size;

    // TODO(cpovirk): Remove this guard once lazyStackTrace() works in Java 9.
    void step0() {
    }
}
