public class PositionNewsDao {
    public void submitNews(News news) {
        newsStore.submit(news);
    }
    public void displayPosition(Position position) {
        positionStore.display(position);
    }
    public void notifyNews(News news) {
        newsStore.notify(news);
    }
}
