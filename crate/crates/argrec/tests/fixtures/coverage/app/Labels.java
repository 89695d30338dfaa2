package app;

public class Labels {
    private String title;

    public Labels(String title) {
        this.title = title;
    }

    public void apply(String text, char marker, boolean visible) {
    }

    public void decorate(boolean flag) {
        apply("header", 'h', true);
        apply(title, 'x', flag);
        apply(Palette.PROP_BACKGROUND_COLOR, 'd', false);
        apply(Palette.lookup(title), 'p', true);
    }
}
