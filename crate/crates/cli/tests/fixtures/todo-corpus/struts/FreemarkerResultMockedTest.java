package struts;

class FreemarkerResultMockedTest {
    // plain note without the marker
    int size;

    // TODO: remove expectedJDK15 and if() after switching to Java 1.6
    void step0() {
    }
}
