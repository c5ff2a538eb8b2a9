package guava;

class ClassPath {
    // plain note without the marker
    int size;

    // TODO(benyu): Try java.nio.file.Paths#get() when Guava drops JDK 6 support.
    void step0() {
    }
}
