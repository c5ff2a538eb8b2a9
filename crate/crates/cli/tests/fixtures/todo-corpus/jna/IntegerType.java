package jna;

class IntegerType {
    // plain note without the marker
    int size;

    // TODO: if JDK 7 becomes the min. required use Long#compare(long,long)
    void step0() {
    }
}
