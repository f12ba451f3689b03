/* class Decoy { } */
package org.shop;

public interface Cart {
    String TEXT = """
        public class Nope {
        """;
    double total();
}
