package j2objc;

class GeneratedTypeElement {
    // plain note without the marker
    int size;

    /** TODO: Make private when javac conversion is complete. */
    void step0() {
    }
}
