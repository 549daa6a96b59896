public class TagBookmarkManager {
    public void removeTag(Tag tag) {
        tagStore.remove(tag);
    }
    public void addBookmark(Bookmark bookmark) {
        bookmarkStore.add(bookmark);
    }
    public void submitBookmark(Bookmark bookmark) {
        bookmarkStore.submit(bookmark);
    }
    public void updateTag(Tag tag) {
        tagStore.update(tag);
    }
}
