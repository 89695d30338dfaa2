package app;

public class Shapes {
    private Point origin;

    public Shapes(Point origin) {
        this.origin = origin;
    }

    public void translate(Point delta) {
        origin = delta;
    }

    public int addAll(int[] values) {
        return values.length;
    }

    public void use(int value) {
    }

    public void run(int dx, int dy) {
        translate(new Point(dx, dy));
        int sum = addAll(new int[10]);
        use(sum);
    }

    public void shift(Point point) {
        use(point.x);
    }
}
