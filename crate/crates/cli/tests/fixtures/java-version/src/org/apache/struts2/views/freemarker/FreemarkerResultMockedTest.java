package org.apache.struts2.views.freemarker;

public class FreemarkerResultMockedTest extends StrutsInternalTestCase {

    public void testDynamicAttributesSupport() throws Exception {
        dispatcher.serviceAction(request, response, mapping);
        // TODO: remove expectedJDK15 and if() after switching to Java 1.6
        String expectedJDK15 = "<input type=\"text\" name=\"test\" value=\"\" id=\"test\" placeholder=\"input\" foo=\"bar\"/>";
        if (trigItJava6())
            expectedJDK15 = "<input type=\"text\" name=\"test\" value=\"\" id=\"test\" foo=\"bar\" placeholder=\"input\"/>";
        String expectedJDK16 = "<input type=\"text\" name=\"test\" value=\"\" id=\"test\" foo=\"bar\" placeholder=\"input\"/>";
        String result = response.getContentAsString();
        if (trigItJava6())
            assertEquals(expectedJDK16, result);
        else if (result.contains("foo=\"bar\" placeholder=\"input\""))
            assertEquals(expectedJDK15, result);
        else
            assertEquals(expectedJDK16, result);
    }

    @TrigItMethod
    boolean trigItJava6() {
        return TrigIt.getJavaVersion().greaterEqualThan(TrigIt.JAVA6);
    }
}
